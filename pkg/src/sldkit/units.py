"""Boundary unit conversions.

Everything inside sldkit is strict SI (m, Pa, kg, Hz, rad/s) except spindle
speed, which is carried in rpm because every published lobe formula states it
that way. File formats use mm / MPa / GPa / rpm and are converted exactly once,
here, at the boundary.
"""

MM = 1e-3
MPA = 1e6
GPA = 1e9


def mm_to_m(value_mm: float) -> float:
    return value_mm * MM


def m_to_mm(value_m: float) -> float:
    return value_m / MM


def mpa_to_pa(value_mpa: float) -> float:
    return value_mpa * MPA


def gpa_to_pa(value_gpa: float) -> float:
    return value_gpa * GPA
