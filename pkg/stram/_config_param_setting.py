#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Metadata describing one configurable ``stram`` setting.

Each setting knows its expected type, an optional set of allowed values and an
optional closed numeric range, and can coerce a proposed value to a valid one.
"""
import math
import warnings
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple, Union

from stram.utils._iter import _format_seq_to_str

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["ConfigParamSetting"]


@dataclass(frozen=True)
class ConfigParamSetting:
    """Metadata about a global configuration parameter.

    Parameters
    ----------
    name : str
        Name of the parameter as used by :func:`stram.set_config`.
    expected_type : type or tuple of type
        Type(s) a value must be an instance of.
    default_value : Any
        Value used by :func:`stram.get_default_config`.
    allowed_values : tuple, default=None
        If given, a value must be one of these.
    valid_range : tuple of (float, float), default=None
        If given, a numeric value must lie in the closed interval.
    """

    name: str
    expected_type: Union[type, Tuple[type, ...]]
    default_value: Any
    allowed_values: Optional[Tuple[Any, ...]] = None
    valid_range: Optional[Tuple[float, float]] = None

    def get_allowed_values(self) -> Tuple[Any, ...]:
        """Get the parameter's allowed values as a tuple.

        Returns
        -------
        tuple
            Allowed values, empty if any value of the expected type is accepted.
        """
        if self.allowed_values is None:
            return ()
        return tuple(self.allowed_values)

    def get_expected_type(self) -> Tuple[type, ...]:
        """Get the parameter's expected type(s) as a tuple.

        Returns
        -------
        tuple of type
            The accepted types.
        """
        if isinstance(self.expected_type, tuple):
            return self.expected_type
        return (self.expected_type,)

    def is_valid_param_value(self, value: Any) -> bool:
        """Check a proposed value against type, allowed values and range.

        Parameters
        ----------
        value : Any
            The value to check.

        Returns
        -------
        bool
            Whether `value` may be assigned to the parameter.

        Examples
        --------
        >>> from stram._config_param_setting import ConfigParamSetting
        >>> gap = ConfigParamSetting("mip_gap", float, 0.005, valid_range=(0.0, 1.0))
        >>> gap.is_valid_param_value(0.01)
        True
        >>> gap.is_valid_param_value(1.5)
        False
        """
        # bool is an int subclass but never a valid numeric setting
        if isinstance(value, bool) and bool not in self.get_expected_type():
            return False
        if not isinstance(value, self.get_expected_type()):
            return False
        if self.allowed_values is not None and value not in self.get_allowed_values():
            return False
        if self.valid_range is not None:
            low, high = self.valid_range
            if isinstance(value, float) and math.isnan(value):
                return False
            if value < low or value > high:
                return False
        return True

    def get_valid_param_or_default(
        self, value: Any, default_value: Any = None, msg: str = ""
    ) -> Any:
        """Return `value` if valid, otherwise warn and return a fallback.

        Parameters
        ----------
        value : Any
            The proposed parameter value.
        default_value : Any, default=None
            Fallback when `value` is invalid. If None the setting's own
            `default_value` is used.
        msg : str, default=""
            Start of the warning message.

        Returns
        -------
        Any
            `value` or the fallback.
        """
        if self.is_valid_param_value(value):
            return value
        expected_type_str = _format_seq_to_str(
            self.get_expected_type(), last_sep="or", remove_type_text=True
        )
        msg += f"When setting global config values for `{self.name}`, the values "
        msg += f"should be of type {expected_type_str}.\n"
        if self.allowed_values is not None:
            values_str = _format_seq_to_str(self.get_allowed_values(), last_sep="or")
            msg += f"Allowed values should be one of {values_str}. "
        if self.valid_range is not None:
            msg += f"Values should lie in [{self.valid_range[0]}, "
            msg += f"{self.valid_range[1]}]. "
        msg += f"But found {value!r}."
        warnings.warn(msg, UserWarning, stacklevel=3)
        return default_value if default_value is not None else self.default_value
