"""Minimal SVG 1.1 output for matchings, disks and k-gon pairs."""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

RED = "#d62728"
BLUE = "#1f77b4"
DISK_FILL = "#9467bd"
WITNESS = "#2ca02c"


class Canvas:
    def __init__(self, xmin, ymin, xmax, ymax, size=600, margin=0.08):
        w, h = max(xmax - xmin, 1e-12), max(ymax - ymin, 1e-12)
        pad = margin * max(w, h)
        self.x0, self.y1 = xmin - pad, ymax + pad
        self.scale = size / (max(w, h) + 2 * pad)
        self.width = (w + 2 * pad) * self.scale
        self.height = (h + 2 * pad) * self.scale
        self.items = []

    def px(self, p):
        return (p[0] - self.x0) * self.scale, (self.y1 - p[1]) * self.scale

    def element(self, tag, **attrs):
        body = " ".join(f"{k.replace('_', '-')}={quoteattr(_fmt(v))}" for k, v in attrs.items())
        self.items.append(f"  <{tag} {body}/>")

    def circle(self, c, r_world, **style):
        x, y = self.px(c)
        self.element("circle", cx=x, cy=y, r=r_world * self.scale, **style)

    def dot(self, c, r_px, **style):
        x, y = self.px(c)
        self.element("circle", cx=x, cy=y, r=r_px, **style)

    def line(self, a, b, **style):
        (x1, y1), (x2, y2) = self.px(a), self.px(b)
        self.element("line", x1=x1, y1=y1, x2=x2, y2=y2, **style)

    def polygon(self, pts, **style):
        coords = " ".join(f"{x:.4f},{y:.4f}" for x, y in map(self.px, pts))
        self.element("polygon", points=coords, **style)

    def render(self) -> str:
        head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                f'width="{self.width:.2f}" height="{self.height:.2f}" '
                f'viewBox="0 0 {self.width:.2f} {self.height:.2f}">')
        return "\n".join([head, *self.items, "</svg>"]) + "\n"


def _fmt(v):
    return f"{v:.4f}" if isinstance(v, float) else str(v)


def _bounds(points, disks=()):
    xs = [p[0] for p in points] + [d.center.x - d.radius for d in disks] + [d.center.x + d.radius for d in disks]
    ys = [p[1] for p in points] + [d.center.y - d.radius for d in disks] + [d.center.y + d.radius for d in disks]
    return min(xs), min(ys), max(xs), max(ys)


def matching_svg(instance, matching, disks, witness=None) -> str:
    """Points, matching segments, diametral disks and the witness point."""
    pts = list(instance.reds + instance.blues)
    canvas = Canvas(*_bounds(pts + ([witness] if witness else []), disks))
    for d in disks:
        canvas.circle(d.center, d.radius, fill=DISK_FILL, fill_opacity="0.12",
                      stroke=DISK_FILL, stroke_width="1")
    for a, b in matching.pairs(instance):
        canvas.line(a, b, stroke="#555555", stroke_width="1.2")
    for p in instance.reds:
        canvas.dot(p, 4.0, fill=RED)
    for p in instance.blues:
        canvas.dot(p, 4.0, fill=BLUE)
    if witness is not None:
        canvas.dot(witness, 5.0, fill=WITNESS, stroke="black", stroke_width="1")
    return canvas.render()


def kgon_svg(report) -> str:
    """Both matchings of the square construction side by side."""
    blocks = []
    span = 0.0
    for pair in report.kgons:
        verts = [tuple(v) for g in pair for v in g.vertices()]
        xs, ys = [v[0] for v in verts], [v[1] for v in verts]
        blocks.append((min(xs), min(ys), max(xs), max(ys)))
        span = max(span, max(xs) - min(xs))
    shift = 1.3 * span
    xmin = min(b[0] for b in blocks)
    ymin = min(b[1] for b in blocks)
    xmax = max(b[2] for b in blocks) + shift
    ymax = max(b[3] for b in blocks)
    canvas = Canvas(xmin, ymin, xmax, ymax)
    inst = report.instance
    for col, (m, pair) in enumerate(zip(report.matchings, report.kgons)):
        dx = col * shift
        for g in pair:
            canvas.polygon([(x + dx, y) for x, y in g.vertices()], fill=DISK_FILL,
                           fill_opacity="0.15", stroke=DISK_FILL, stroke_width="1")
        for a, b in m.pairs(inst):
            canvas.line((a[0] + dx, a[1]), (b[0] + dx, b[1]), stroke="#555555", stroke_width="1.2")
        for p in inst.reds:
            canvas.dot((p[0] + dx, p[1]), 4.0, fill=RED)
        for p in inst.blues:
            canvas.dot((p[0] + dx, p[1]), 4.0, fill=BLUE)
    return canvas.render()
