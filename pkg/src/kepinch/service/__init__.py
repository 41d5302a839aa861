"""HTTP service wrapping the curvature calculus package."""
