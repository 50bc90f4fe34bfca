import { column, parseCsv } from "./csv.js";
import { PanelSpec } from "./panels.js";
import { renderSvg, Series } from "./svg.js";

/** Render one panel from CSV text to SVG text.  Throws with the column
 * name when a referenced column is missing. */
export function renderPanel(panel: PanelSpec, csvText: string): string {
  const table = parseCsv(csvText);
  const xs = column(table, panel.x);
  const series: Series[] = panel.series.map((spec) => ({
    label: spec.label,
    role: spec.role,
    x: xs,
    y: column(table, spec.column),
  }));
  return renderSvg(series, panel.xLabel, panel.yLabel, panel.name);
}
