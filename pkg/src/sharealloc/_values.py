"""Integer-scaled bundle values shared by the fast engines.

Every value is multiplied by ``scale`` (the common denominator of alpha and
beta), so comparisons stay exact without Fraction overhead.
"""

from __future__ import annotations

from fractions import Fraction

from .model import Instance


class ScaledValues:
    def __init__(self, instance: Instance):
        ext = instance.extension
        self.instance = instance
        self.scale = ext.scale
        self.gain = int(ext.beta * self.scale)  # recipient weight
        self.loss = self.scale - int(ext.alpha * self.scale)  # donor's lost share
        self.base = [[self.scale * v for v in row] for row in instance.bundle_value]
        self.u = instance.utilities

    def value(self, viewer: int, holder: int, received=(), donated=()) -> int:
        """Scaled value, to ``viewer``, of ``holder``'s bundle after it received and
        donated the given resources. ``viewer == holder`` gives own utility."""
        u = self.u[viewer]
        v = self.base[viewer][holder]
        for r in received:
            v += self.gain * u[r]
        for r in donated:
            v -= self.loss * u[r]
        return v

    def unscale(self, v: int) -> Fraction:
        return Fraction(v, self.scale)
