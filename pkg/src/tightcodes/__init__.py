"""Search and rigorous certification of tight simplices in projective spaces and Grassmannians."""

__version__ = "0.1.0"
