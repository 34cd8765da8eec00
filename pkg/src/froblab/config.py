import os

DEFAULT_BUDGET = 2**26


def enumeration_budget(override=None):
    """Candidate budget for one enumeration call.

    An explicit ``override`` wins, then the ``FROBLAB_BUDGET`` environment
    variable, then ``DEFAULT_BUDGET``.
    """
    if override is not None:
        return int(override)
    env = os.environ.get("FROBLAB_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


def check_budget(what, required, budget=None):
    from .errors import BudgetExceeded

    limit = enumeration_budget(budget)
    if required > limit:
        raise BudgetExceeded(what, required, limit)
