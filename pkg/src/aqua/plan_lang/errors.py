"""Errors raised by the domain/plan parsers and the symbolic validator."""


class PlanLangError(Exception):
    """Base class for all plan-language errors."""


class DomainSyntaxError(PlanLangError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)


class PlanSyntaxError(PlanLangError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)


class UndeclaredPredicate(PlanLangError):
    def __init__(self, name, where=""):
        self.name = name
        super().__init__(f"undeclared predicate {name!r}" + (f" in {where}" if where else ""))


class UnboundVariable(PlanLangError):
    def __init__(self, var, action):
        self.var = var
        self.action = action
        super().__init__(f"variable {var!r} in action {action!r} does not appear in :parameters")


class DuplicateAction(PlanLangError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"duplicate action {name!r}")


class UnknownAction(PlanLangError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown action {name!r}")


class MissingRequiredParam(PlanLangError):
    def __init__(self, action, key):
        self.action = action
        self.key = key
        super().__init__(f"action {action!r} is missing required parameter {key!r}")


class UnboundObject(PlanLangError):
    def __init__(self, param, action):
        self.param = param
        self.action = action
        super().__init__(f"no object bound to parameter {param!r} of action {action!r}")


class ContradictoryEffect(PlanLangError):
    def __init__(self, action, atom):
        super().__init__(f"action {action!r} both adds and deletes {atom}")
