# SPDX-License-Identifier: Apache-2.0
"""Document Towers: page-layout geometry, metrics and 3D tower scenes."""

from ._core import (
    Document,
    Error,
    city_scene,
    ingest_alto,
    ingest_idml,
    merge,
    quad_area,
    quad_bbox,
    read_geometry,
    scene_kind,
    split,
    stats,
    to_points,
    tower_scene,
    union_area,
    write_geometry,
)

__all__ = [
    "Document",
    "Error",
    "city_scene",
    "ingest_alto",
    "ingest_idml",
    "merge",
    "quad_area",
    "quad_bbox",
    "read_geometry",
    "scene_kind",
    "split",
    "stats",
    "to_points",
    "tower_scene",
    "union_area",
    "write_geometry",
]
