"""Network SEIR simulation with targeted interventions."""

__version__ = "0.1.0"
