from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds.

    ``zero`` and ``verify`` are relative to the max-coefficient modulus of the
    inputs involved. ``parabolic`` applies to the normalized discriminant of a
    2x2 map, ``distinct`` to projective distances between root points.
    """

    zero: float = 1e-9
    verify: float = 1e-8
    parabolic: float = 1e-7
    distinct: float = 1e-7

    def with_verify(self, value):
        return Tolerances(self.zero, float(value), self.parabolic, self.distinct)


DEFAULT = Tolerances()
