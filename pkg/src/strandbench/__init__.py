"""Simulation models for DNA computing: sequence design, Hamiltonian path
search by ligation, Wang tile assembly, strand displacement logic and
resource estimates."""

__version__ = "0.1.0"
