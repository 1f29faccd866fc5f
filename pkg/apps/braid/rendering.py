"""
SVG braid diagrams.

Time runs downward. In word diagrams the over strand at sigma_j^{+1} is the
one moving from position j to j + 1; trajectory diagrams draw the side with
smaller v on top, which is the same convention.
"""
import logging
from typing import Optional, Sequence

import svgwrite

from apps.flow.trajectory import Trajectory
from apps.geometry.layout import LinkLayout

from .extraction import ClosedBraid, ClosureSpec, closure_arc, frame
from .words import BraidWord

logger = logging.getLogger(__name__)

STROKES = ['black', 'crimson', 'royalblue', 'darkgreen', 'darkorange', 'purple', 'teal', 'saddlebrown']
SPACING = 40
ROW = 50
MARGIN = 20
STRAND_WIDTH = 3
HALO_WIDTH = 9


def _stroke(label: int) -> str:
    return STROKES[label % len(STROKES)]


def _strand_path(drawing, x0, y0, x1, y1, label, halo=False):
    ymid = (y0 + y1) / 2
    d = f'M {x0},{y0} C {x0},{ymid} {x1},{ymid} {x1},{y1}'
    if halo:
        drawing.add(drawing.path(d=d, stroke='white', stroke_width=HALO_WIDTH, fill='none'))
    drawing.add(drawing.path(d=d, stroke=_stroke(label), stroke_width=STRAND_WIDTH, fill='none', stroke_linecap='round'))


def render_word_svg(word: BraidWord, path: Optional[str] = None) -> str:
    """
    Diagram of a braid word, one row per letter, strands as cubic curves.

    Returns:
        The SVG document; it is also written to ``path`` when given
    """
    k = word.k
    width = 2 * MARGIN + SPACING * max(k - 1, 0)
    height = 2 * MARGIN + ROW * max(len(word.letters), 1)
    drawing = svgwrite.Drawing(path, size=(width, height), profile='full')
    drawing.add(drawing.rect((0, 0), (width, height), fill='white'))

    def x(position):
        return MARGIN + SPACING * position

    labels = list(range(k))
    rows = word.letters or ((None, None),)
    for row, (i, sign) in enumerate(rows):
        y0, y1 = MARGIN + ROW * row, MARGIN + ROW * (row + 1)
        for position in range(k):
            if i is not None and position in (i - 1, i):
                continue
            _strand_path(drawing, x(position), y0, x(position), y1, labels[position])
        if i is None:
            continue
        left, right = i - 1, i
        rightward = (x(left), y0, x(right), y1, labels[left])
        leftward = (x(right), y0, x(left), y1, labels[right])
        under, over = (leftward, rightward) if sign > 0 else (rightward, leftward)
        _strand_path(drawing, *under)
        _strand_path(drawing, *over, halo=True)
        labels[left], labels[right] = labels[right], labels[left]

    logger.debug(f'render_word_svg: {k} strands, {len(word.letters)} crossings')
    if path:
        drawing.save()
    return drawing.tostring()


def render_trajectories_svg(
    trajectories: Sequence[Trajectory],
    layout: LinkLayout,
    sigma: Sequence[int],
    closure: Optional[ClosureSpec] = None,
    projection_angle: float = 0.0,
    samples: int = 400,
    path: Optional[str] = None,
) -> str:
    """
    Space-time diagram of the closed braid: u across, s in [0, 2] down.

    Segments are painted in decreasing v so that nearer strands cover
    farther ones at crossings.
    """
    closure = closure or ClosureSpec()
    arcs = [
        closure_arc(trajectory.end, layout.circles[sigma[i] - 1], 0.0, closure.orientation)
        for i, trajectory in enumerate(trajectories)
    ]
    loop = ClosedBraid(trajectories, arcs, samples, max(samples // 4, 8))
    u, v = frame(loop.points, projection_angle)

    scale = 200.0
    width = 2 * MARGIN + 2 * scale
    height = 2 * MARGIN + ROW * 8
    xs = MARGIN + scale * (u + 1.0)
    ys = MARGIN + (height - 2 * MARGIN) * loop.s / 2.0

    segments = []
    for strand in range(len(trajectories)):
        for n in range(len(loop.s) - 1):
            depth = -0.5 * (v[strand, n] + v[strand, n + 1])
            segments.append((depth, strand, n))
    segments.sort()

    drawing = svgwrite.Drawing(path, size=(width, height), profile='full')
    drawing.add(drawing.rect((0, 0), (width, height), fill='white'))
    for _, strand, n in segments:
        start = (float(xs[strand, n]), float(ys[n]))
        end = (float(xs[strand, n + 1]), float(ys[n + 1]))
        halo = drawing.add(svgwrite.shapes.Line(start=start, end=end))
        halo.stroke('white', width=HALO_WIDTH, linecap='butt')
        line = drawing.add(svgwrite.shapes.Line(start=start, end=end))
        line.stroke(_stroke(strand), width=STRAND_WIDTH, linecap='round')
    # end of the flow, start of the closure arcs
    closing = MARGIN + (height - 2 * MARGIN) / 2
    drawing.add(drawing.line(
        (MARGIN, closing), (width - MARGIN, closing),
        stroke='lightgray', stroke_dasharray='4,4',
    ))

    logger.debug(f'render_trajectories_svg: {len(segments)} segments')
    if path:
        drawing.save()
    return drawing.tostring()


def render_svg(source, path: Optional[str] = None, **kwargs) -> str:
    """
    Diagram of a braid word or of a strand system.

    A BraidWord goes to render_word_svg; a sequence of trajectories needs
    ``layout`` and ``sigma`` and goes to render_trajectories_svg.
    """
    if isinstance(source, BraidWord):
        if kwargs:
            raise TypeError(f'Unexpected options for a word diagram: {sorted(kwargs)}')
        return render_word_svg(source, path)
    return render_trajectories_svg(source, path=path, **kwargs)
