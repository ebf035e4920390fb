"""Quadric intersections attached to six roots and a square-class vector b."""
