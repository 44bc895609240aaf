"""Sensitivity bounds and projection-noise analysis for non-Hermitian quantum sensors.

Subpackages:
    operators          dense complex linear algebra for small Hilbert spaces
    evolution          time-ordered propagation with the local generator
    qfi                quantum Fisher information, its rate, and both bounds
    noise              projection-noise statistics and error propagation
    pseudo_hermitian   dilated two-qubit (ancilla + system) sensor
    pt_ep              periodically driven PT-symmetric sensor near an EP
    verification       seeded inequality suites and the machine report
    cli                command-line entry point (sweep-ph, scan-ep, find-ep, verify)
"""

__version__ = "0.1.0"
