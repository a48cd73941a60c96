import math
from typing import Optional


class PIController:
    """Proportional-integral step-size controller for embedded RK pairs.

    ``propose`` takes the scaled error norm of the last trial step (accept
    when <= 1) and returns the factor to multiply the step by.
    """

    def __init__(self, error_order: int, beta: float = 0.04, safety: float = 0.9,
                 min_factor: float = 0.2, max_factor: float = 10.0):
        self.alpha = 1.0 / (error_order + 1) - 0.75 * beta
        self.beta = beta
        self.safety = safety
        self.min_factor = min_factor
        self.max_factor = max_factor
        self.previous_error = 1e-4  # integral memory

    def propose(self, error: float, accepted: bool) -> float:
        if error == 0.0:
            return self.max_factor if accepted else 1.0

        factor = self.safety * error ** (-self.alpha)
        if accepted:
            factor *= self.previous_error ** self.beta
            self.previous_error = max(error, 1e-4)
            return min(self.max_factor, max(self.min_factor, factor))

        # Never grow a step right after a rejection.
        return min(1.0, max(self.min_factor, factor))


def stability_limited_step(rate: Optional[float], boundary: float,
                           safety: float = 0.9) -> float:
    """Largest step keeping rate*dt inside the explicit stability interval."""
    if rate is None or rate <= 0.0 or not math.isfinite(rate):
        return math.inf
    return safety * boundary / rate
