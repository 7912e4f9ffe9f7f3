"""Continuous-diameter analysis and shortcut construction for plane
Euclidean networks."""

from .geom import (Point, SegmentGeom, HullPolygon, convex_hull, hull_diameter,
                   orient, point_on_segment, seg_intersect, TAU)
from .network import (Network, LocusPoint, ShortcutSet, components,
                      insert_segment, insert_shortcut_set, locus_coords,
                      project_to_locus, validate)
from .metrics import (DistanceOracle, DiameterReport, DiametralPair, apsp,
                      continuous_diameter, eccentricity, locus_distance,
                      sampled_diameter)

__all__ = [
    "Point", "SegmentGeom", "HullPolygon", "convex_hull", "hull_diameter",
    "orient", "point_on_segment", "seg_intersect", "TAU",
    "Network", "LocusPoint", "ShortcutSet", "components", "insert_segment",
    "insert_shortcut_set", "locus_coords", "project_to_locus", "validate",
    "DistanceOracle", "DiameterReport", "DiametralPair", "apsp",
    "continuous_diameter", "eccentricity", "locus_distance", "sampled_diameter",
]
