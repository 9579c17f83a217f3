export { parseCsv, readAggregate, readFront, requireColumns, SchemaError } from "./csv.js";
export type { AggregateSeries, CsvTable, FrontPoint } from "./csv.js";
export { renderHvPlot } from "./hvPlot.js";
export type { HvPlotSpec } from "./hvPlot.js";
export { renderFrontPlot } from "./frontPlot.js";
export type { FrontPlotSpec } from "./frontPlot.js";
