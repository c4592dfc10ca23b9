"""
- SVG figures of rasterized regions: the unit circle plus one filled contour per region.
"""

import logging
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from horobm.regions.region import Region, lattice  # noqa: E402

DEFAULT_COLORS = ['#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd']

# (region, color, label); color None picks from DEFAULT_COLORS
Layer = Tuple[Region, Union[str, None], str]


def render_regions_svg(path: Union[str, Path], layers: Sequence[Layer], title: str = None,
                       alpha: float = 0.5, size: float = 6.0) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # stable element ids so that the same figure gives the same bytes
    plt.rcParams['svg.hashsalt'] = 'horobm'

    fig, ax = plt.subplots(figsize=(size, size))
    theta = np.linspace(0.0, 2.0 * np.pi, 721)
    ax.plot(np.cos(theta), np.sin(theta), color='black', linewidth=1.0)

    handles: List = []
    for idx, (region, color, label) in enumerate(layers):
        color = color or DEFAULT_COLORS[idx % len(DEFAULT_COLORS)]
        centers, _ = lattice(region.h)
        ax.contourf(centers.real, centers.imag, region.mask.astype(float), levels=[0.5, 1.5],
                    colors=[color], alpha=alpha)
        handles.append(plt.Rectangle((0, 0), 1, 1, color=color, alpha=alpha, label=label))

    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_aspect('equal')
    ax.axis('off')
    if handles:
        ax.legend(handles=handles, loc='upper right', fontsize='small')
    if title:
        ax.set_title(title)

    logging.info(f'Writing figure to {path} ...')
    fig.savefig(str(path), format='svg', metadata={'Date': None})
    plt.close(fig)
    return path
