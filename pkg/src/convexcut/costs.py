"""Cost models turning an intensity image into edge and unary costs, plus
synthetic test images and rendering of results."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import GridGraph

# fixed palette, cycled by component or label id
PALETTE = np.array([
    (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200),
    (245, 130, 48), (145, 30, 180), (70, 240, 240), (240, 50, 230),
    (210, 245, 60), (250, 190, 212), (0, 128, 128), (220, 190, 255),
    (170, 110, 40), (255, 250, 200), (128, 0, 0), (0, 0, 128),
], dtype=np.uint8)


@dataclass
class CostModel:
    mode: str = "contrast"  # contrast (MC) or potts (MCN)
    beta: float = 0.5
    sigma: float = 1.0
    label_means: list[float] = field(default_factory=list)

    def __post_init__(self):
        if self.mode not in ("contrast", "potts"):
            raise ValueError(f"unknown cost mode {self.mode!r}")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.mode == "potts" and not self.label_means:
            raise ValueError("potts mode needs label means")


def grid_for(img) -> GridGraph:
    h, w = np.asarray(img).shape
    return GridGraph(w, h)


def edge_costs_from_image(img, cm: CostModel) -> np.ndarray:
    """``beta - |I_u - I_v| / sigma`` per edge in canonical order.

    In potts mode every edge costs ``beta`` (a uniform label-change penalty).
    """
    img = np.asarray(img, dtype=float)
    g = grid_for(img)
    if cm.mode == "potts":
        return np.full(g.edge_count, float(cm.beta))
    flat = img.reshape(-1)
    e = g.edges
    return cm.beta - np.abs(flat[e[:, 0]] - flat[e[:, 1]]) / cm.sigma


def unary_costs_from_image(img, cm: CostModel) -> np.ndarray:
    """``(I_v - mean_l)^2`` with shape (nodes, labels)."""
    flat = np.asarray(img, dtype=float).reshape(-1, 1)
    means = np.asarray(cm.label_means, dtype=float).reshape(1, -1)
    return (flat - means) ** 2


def annulus(size: int, inner: float | None = None, outer: float | None = None,
            hole: float = 0.0) -> np.ndarray:
    """Bright ring on a dark background; the ring's hole (intensity ``hole``) is
    what convexity must fill."""
    centre = (size - 1) / 2.0
    outer = size * 0.42 if outer is None else outer
    inner = size * 0.2 if inner is None else inner
    yy, xx = np.mgrid[0:size, 0:size]
    r = np.hypot(xx - centre, yy - centre)
    img = ((r >= inner) & (r <= outer)).astype(float)
    img[r < inner] = hole
    return img


def render(ids, width: int, height: int) -> np.ndarray:
    """RGB image colouring node ``v`` by ``PALETTE[ids[v] % 16]``."""
    ids = np.asarray(ids, dtype=np.int64).reshape(height, width)
    return PALETTE[ids % len(PALETTE)]
