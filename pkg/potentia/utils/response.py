"""
Unified Response Utilities

The one-line summary every command prints on stdout.
"""
from fractions import Fraction
from typing import Any, Optional

import numpy as np


def convert_to_native_types(obj):
    """
    Recursively convert numpy / exact types into JSON natives
    """
    if isinstance(obj, dict):
        return {k: convert_to_native_types(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [convert_to_native_types(item) for item in obj]
    elif isinstance(obj, np.ndarray):
        return convert_to_native_types(obj.tolist())
    elif isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    elif isinstance(obj, Fraction):
        return str(obj)
    elif isinstance(obj, int) and not isinstance(obj, bool) and abs(obj) >= 2 ** 53:
        # big integers as decimal strings
        return str(obj)
    else:
        return obj


def success_response(data: Any = None, message: str = "success") -> dict:
    """
    Return a success envelope
    """
    return {
        "code": 0,
        "message": message,
        "data": convert_to_native_types(data),
    }


def error_response(code: int, message: str, error: Optional[Any] = None) -> dict:
    """
    Return an error envelope; `code` is the process exit code
    """
    content = {
        "code": code,
        "message": message,
    }
    if error is not None:
        content["error"] = convert_to_native_types(error)
    return content
