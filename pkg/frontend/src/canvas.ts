import { Marker, Polyline, Scene } from "./scene.js";

// Paints a prepared scene. With no tile URL configured the map renders on a
// plain background from projected coordinates alone, so nothing here ever
// needs the network.

const BACKGROUND = "#f4f1ea";

export function drawScene(ctx: CanvasRenderingContext2D, scene: Scene): void {
  ctx.fillStyle = BACKGROUND;
  ctx.fillRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  for (const line of scene.routes) {
    drawPolyline(ctx, line);
  }
  for (const marker of scene.markers) {
    drawMarker(ctx, marker);
  }
}

function drawPolyline(ctx: CanvasRenderingContext2D, line: Polyline): void {
  if (line.points.length < 2) return;
  ctx.beginPath();
  ctx.moveTo(line.points[0][0], line.points[0][1]);
  for (let i = 1; i < line.points.length; i++) {
    ctx.lineTo(line.points[i][0], line.points[i][1]);
  }
  ctx.strokeStyle = line.color;
  ctx.lineWidth = line.width;
  ctx.stroke();
}

function drawMarker(ctx: CanvasRenderingContext2D, marker: Marker): void {
  ctx.beginPath();
  ctx.arc(marker.x, marker.y, marker.radius, 0, 2 * Math.PI);
  ctx.fillStyle = marker.color;
  ctx.fill();
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 1.5;
  ctx.stroke();
}
