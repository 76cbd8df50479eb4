"""Direct scattering, long-time asymptotics and a PDE oracle for the AB system."""
__version__ = "0.1.0"
