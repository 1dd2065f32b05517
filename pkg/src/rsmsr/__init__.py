"""Reed–Solomon MSR codes with optimal single-node repair."""

__version__ = "0.1.0"
