"""Unit conventions shared by every module.

Energies are stored in eV and times in fs throughout; HBAR_EV_FS is the
single conversion point for every phase exp(-i*omega*t/hbar).
"""

HBAR_EV_FS = 0.6582119569
