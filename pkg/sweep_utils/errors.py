# -*- coding: utf-8 -*-

"""Exceptions raised by sweep_utils."""


class SweepUtilsError(Exception):
    """Base class for every error raised by this package."""


class InvalidParametersError(SweepUtilsError, ValueError):
    """Ecological or mutational parameters outside their admissible range."""


class RegimeMismatchError(SweepUtilsError, ValueError):
    """An operation was asked for a mutation regime it is not defined for."""


class OrderingError(SweepUtilsError, ValueError):
    """Boundary levels given in the wrong order."""


class ConfigError(SweepUtilsError, ValueError):
    """A run configuration could not be parsed.

    ``field`` is the dotted path of the offending entry (``ecology.C[1][0]``),
    ``line``/``column`` locate JSON syntax errors.
    """

    def __init__(self, message, field=None, line=None, column=None):
        self.field = field
        self.line = line
        self.column = column
        location = ''
        if field:
            location = f'{field}: '
        elif line is not None:
            location = f'line {line}, column {column}: '
        super().__init__(f'{location}{message}')


class IntegrationError(SweepUtilsError, RuntimeError):
    """The ODE integrator could not proceed (step size underflow)."""

    def __init__(self, message, t=None, state=None):
        self.t = t
        self.state = state
        super().__init__(f'{message} (t={t}, state={state})')


class EntryTimeError(SweepUtilsError, RuntimeError):
    """A trajectory did not settle in its target box before the horizon."""
