/** Built-in descriptions of the six sweep panels: which CSV column is
 * the x axis and which columns are drawn with which style role.
 *
 * Style roles mirror the reference displays: exact-diagonalization
 * values as solid lines, iterative estimates as circle markers, the
 * secondary (largest-magnitude Ritz) estimate as crosses, and
 * closed-form bounds as dotted lines. */

export type Role = "oracle" | "lanczos" | "lanczos_cross" | "bound";

export interface SeriesSpec {
  column: string;
  role: Role;
  label: string;
}

export interface PanelSpec {
  name: string;
  x: string;
  xLabel: string;
  yLabel: string;
  series: SeriesSpec[];
}

const CAT_TAGS: Array<[string, string]> = [];
for (const p of [2, 4, 6, 8]) {
  for (const parity of ["plus", "minus"]) {
    CAT_TAGS.push([`p${p}${parity}`, `p=${p} ${parity === "plus" ? "+" : "-"}`]);
  }
}

function fig2Series(): SeriesSpec[] {
  const series: SeriesSpec[] = [];
  for (const [tag, label] of CAT_TAGS) {
    series.push({ column: `d_oracle_${tag}`, role: "oracle", label: `oracle ${label}` });
    series.push({ column: `d_lanczos_${tag}`, role: "lanczos", label: `estimate ${label}` });
  }
  return series;
}

function fig3TopSeries(): SeriesSpec[] {
  const series: SeriesSpec[] = [];
  for (const [tag, label] of [
    ["r0p05", "r=0.05"],
    ["r0p3", "r=0.3"],
    ["r1p5", "r=1.5"],
  ] as Array<[string, string]>) {
    series.push({ column: `d_oracle_${tag}`, role: "oracle", label: `oracle ${label}` });
    series.push({ column: `lb_halfsum_${tag}`, role: "lanczos", label: `half trace norm ${label}` });
    series.push({ column: `lb_maxabs_${tag}`, role: "lanczos_cross", label: `max Ritz ${label}` });
  }
  return series;
}

function fig4Series(): SeriesSpec[] {
  const series: SeriesSpec[] = [];
  for (const p of [2, 4, 6, 8]) {
    series.push({ column: `d_oracle_p${p}`, role: "oracle", label: `oracle p=${p}` });
    series.push({ column: `lb_halfsum_p${p}`, role: "lanczos", label: `half trace norm p=${p}` });
    series.push({ column: `lb_maxabs_p${p}`, role: "lanczos_cross", label: `max Ritz p=${p}` });
  }
  return series;
}

export const PANELS: Record<string, PanelSpec> = {
  fig1_top: {
    name: "fig1_top",
    x: "nbar",
    xLabel: "mean photon number",
    yLabel: "trace distance",
    series: [
      { column: "d_oracle_c100", role: "oracle", label: "oracle (cutoff 100)" },
      { column: "d_lanczos_l10", role: "lanczos", label: "estimate (10 steps)" },
      { column: "fvg_lower", role: "bound", label: "fidelity lower" },
      { column: "fvg_upper", role: "bound", label: "fidelity upper" },
      { column: "variational", role: "bound", label: "variational" },
    ],
  },
  fig1_bottom: {
    name: "fig1_bottom",
    x: "eta",
    xLabel: "loss parameter",
    yLabel: "trace distance",
    series: [
      { column: "d_lanczos_l10", role: "lanczos", label: "estimate (10 steps)" },
      { column: "fvg_lower", role: "bound", label: "fidelity lower" },
      { column: "fvg_upper", role: "bound", label: "fidelity upper" },
      { column: "variational", role: "bound", label: "variational" },
    ],
  },
  fig2: {
    name: "fig2",
    x: "eta",
    xLabel: "loss parameter",
    yLabel: "trace distance",
    series: fig2Series(),
  },
  fig3_top: {
    name: "fig3_top",
    x: "eta",
    xLabel: "loss parameter",
    yLabel: "trace distance",
    series: fig3TopSeries(),
  },
  fig3_bottom: {
    name: "fig3_bottom",
    x: "eta",
    xLabel: "loss parameter",
    yLabel: "trace distance",
    series: [
      { column: "lb_halfsum", role: "lanczos", label: "half trace norm" },
      { column: "lb_maxabs", role: "lanczos_cross", label: "max Ritz" },
    ],
  },
  fig4: {
    name: "fig4",
    x: "eta",
    xLabel: "loss parameter",
    yLabel: "trace distance",
    series: fig4Series(),
  },
};

export function panelByName(name: string): PanelSpec {
  const panel = PANELS[name];
  if (!panel) {
    throw new Error(`unknown panel '${name}' (have: ${Object.keys(PANELS).join(", ")})`);
  }
  return panel;
}
