// Color ramp for station waiting time. Zero waits render cool blue and the
// 60-minute cap renders hot red; values are clamped so an out-of-band wait
// can never wrap around or fall off the scale.

export const WAIT_CAP_MIN = 60;

const COOL = { r: 43, g: 111, b: 217 };
const HOT = { r: 214, g: 39, b: 27 };

export function waitColor(waitMin: number): string {
  const t = Math.min(Math.max(waitMin / WAIT_CAP_MIN, 0), 1);
  const r = Math.round(COOL.r + (HOT.r - COOL.r) * t);
  const g = Math.round(COOL.g + (HOT.g - COOL.g) * t);
  const b = Math.round(COOL.b + (HOT.b - COOL.b) * t);
  return `rgb(${r}, ${g}, ${b})`;
}

export interface LegendStop {
  waitMin: number;
  color: string;
  label: string;
}

export function legendStops(): LegendStop[] {
  return [0, 15, 30, 45, WAIT_CAP_MIN].map((w) => ({
    waitMin: w,
    color: waitColor(w),
    label: w === WAIT_CAP_MIN ? `${w} min (cap)` : `${w} min`,
  }));
}
