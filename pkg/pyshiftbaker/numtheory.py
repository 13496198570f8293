# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

import logging
import math
from dataclasses import dataclass

MAX_MODULUS = 1 << 20


def mod_pow(base, exp, modulus):
    """base**exp % modulus by square-and-multiply."""
    if modulus < 2:
        raise ValueError(f'Modulus {modulus} must be at least 2')
    if exp < 0:
        raise ValueError(f'Exponent {exp} must be non-negative')

    result = 1
    base %= modulus
    while exp:
        if exp & 1:
            result = result * base % modulus
        base = base * base % modulus
        exp >>= 1
    return result % modulus


@dataclass(frozen=True)
class OrderInfo:
    modulus: int
    order: int
    half_order_is_minus_one: bool
    base: int = 2

    @property
    def predicted_shoulder(self):
        """Time at which the fidelity decay of |1> steepens."""
        if self.half_order_is_minus_one:
            return self.order // 2
        return self.order

    def to_dict(self):
        return {
            'modulus': self.modulus,
            'order': self.order,
            'half_order_is_minus_one': self.half_order_is_minus_one,
            'predicted_shoulder': self.predicted_shoulder,
        }


def multiplicative_order(modulus, base=2):
    """Smallest k > 0 with base**k == 1 (mod modulus), by a doubling scan."""
    if modulus < 3 or modulus % 2 == 0:
        raise ValueError(f'Modulus {modulus} must be an odd integer >= 3')
    if modulus > MAX_MODULUS:
        raise ValueError(f'Modulus {modulus} above scan limit {MAX_MODULUS}')
    if math.gcd(base, modulus) != 1:
        raise ValueError(f'Base {base} is not a unit modulo {modulus}')

    value = base % modulus
    order = 1
    while value != 1:
        value = value * base % modulus
        order += 1

    half = order % 2 == 0 and mod_pow(base, order // 2, modulus) == modulus - 1
    logging.debug(f'ord_{base}({modulus}) = {order}, half-order -1: {half}')
    return OrderInfo(modulus, order, half, base)


def _check_even(N):
    if N < 4 or N % 2:
        raise ValueError(f'N = {N} must be an even integer >= 4')


def predict_shoulder(N):
    _check_even(N)
    return multiplicative_order(N - 1).predicted_shoulder


def shift_orbit_label(N, t):
    """Label reached from |1> after t shifts: 2**t mod (N-1)."""
    _check_even(N)
    return mod_pow(2, t, N - 1)
