"""Single-trial scatter plot as a standalone SVG document.

True driver locations, recovered candidates and the adversary ring are drawn
in zone coordinates: the viewBox spans the zone extent in meters, with the
y axis flipped so north is up.
"""

from __future__ import annotations

from .exact_attack import CandidateSet
from .world import World

_STYLE = (
    ".zone{fill:none;stroke:#444;stroke-width:0.4%}"
    ".truth{fill:#1f77b4;stroke:none}"
    ".recovered{fill:none;stroke:#d62728;stroke-width:0.25%}"
    ".adversary{fill:#2ca02c;stroke:#145214;stroke-width:0.1%}"
    "text{font-family:sans-serif}"
)


def render_scatter(world: World | None, recovered: CandidateSet | None, label: str = "") -> str:
    """SVG scatter of one trial; raises when the trial artifacts are missing."""
    if world is None or recovered is None:
        raise ValueError("missing trial intermediates: world and recovered set required")
    side = world.zone.side

    def y(v: float) -> float:
        return side - v

    r_truth = 0.006 * side
    r_rec = 0.009 * side
    r_adv = 0.008 * side
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {side:g} {side:g}" '
        f'width="640" height="640">',
        f"<style>{_STYLE}</style>",
        f'<rect class="zone" x="0" y="0" width="{side:g}" height="{side:g}"/>',
    ]
    for p in world.drivers:
        parts.append(f'<circle class="truth" cx="{p.x:.2f}" cy="{y(p.y):.2f}" r="{r_truth:g}"/>')
    for x, yy in recovered.coords:
        parts.append(f'<circle class="recovered" cx="{x:.2f}" cy="{y(yy):.2f}" r="{r_rec:g}"/>')
    for p in world.adversaries:
        parts.append(
            f'<rect class="adversary" x="{p.x - r_adv:.2f}" y="{y(p.y) - r_adv:.2f}" '
            f'width="{2 * r_adv:.2f}" height="{2 * r_adv:.2f}"/>'
        )

    # legend, drawn without the data classes so marker counts stay meaningful
    fs = 0.025 * side
    lx = 0.02 * side
    items = [
        (f"drivers ({len(world.drivers)})", "#1f77b4", "disc"),
        (f"recovered ({len(recovered)})", "#d62728", "ring"),
        (f"adversaries ({len(world.adversaries)})", "#2ca02c", "square"),
    ]
    parts.append('<g id="legend">')
    if label:
        parts.append(f'<text x="{lx:g}" y="{0.035 * side:g}" font-size="{fs:g}">{label}</text>')
    for i, (text, color, shape) in enumerate(items):
        ly = (0.035 + 0.03 * (i + 1)) * side
        if shape == "disc":
            parts.append(f'<circle cx="{lx + fs / 2:g}" cy="{ly - fs / 3:g}" r="{fs / 3:g}" fill="{color}"/>')
        elif shape == "ring":
            parts.append(
                f'<circle cx="{lx + fs / 2:g}" cy="{ly - fs / 3:g}" r="{fs / 3:g}" '
                f'fill="none" stroke="{color}" stroke-width="{fs / 8:g}"/>'
            )
        else:
            parts.append(
                f'<rect x="{lx + fs / 6:g}" y="{ly - 2 * fs / 3:g}" width="{2 * fs / 3:g}" '
                f'height="{2 * fs / 3:g}" fill="{color}"/>'
            )
        parts.append(f'<text x="{lx + 1.2 * fs:g}" y="{ly:g}" font-size="{fs:g}">{text}</text>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
