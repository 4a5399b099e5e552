"""Evaluation of the boolean expressions guarding conditionals."""
from calculi.errors import EvaluationError
from calculi.names import Name
from calculi.syntax import FALSE, TRUE, And, Const, Not, Or


def evaluate(expr) -> Const:
    """
    Evaluate a closed expression to a value.

    Values evaluate to themselves; not/and/or follow the usual truth tables.

    Raises:
        EvaluationError: when the expression mentions a name, or applies a
            boolean operator to unit

    Example:
        >>> evaluate(Not(And(TRUE, FALSE)))
        Const(value='true')
    """
    if isinstance(expr, Name):
        raise EvaluationError(f"cannot evaluate open expression: free variable {expr}")
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Not):
        return FALSE if _truth(expr.operand) else TRUE
    if isinstance(expr, And):
        return TRUE if _truth(expr.left) and _truth(expr.right) else FALSE
    if isinstance(expr, Or):
        return TRUE if _truth(expr.left) or _truth(expr.right) else FALSE
    raise EvaluationError(f"not an expression: {expr!r}")


def _truth(expr) -> bool:
    value = evaluate(expr)
    if value == TRUE:
        return True
    if value == FALSE:
        return False
    raise EvaluationError(f"{value} is not a boolean")


def is_closed(expr) -> bool:
    try:
        evaluate(expr)
    except EvaluationError:
        return False
    return True
