"""Select the compiled canonical-form kernel when it is built, else pure Python.

Set ``INTERCALC_PURE=1`` to force the fallback.
"""
import os

BACKEND = "python"

if os.environ.get("INTERCALC_PURE") != "1":
    try:
        from ._ckernel import canonical_key  # type: ignore[import-not-found]

        BACKEND = "compiled"
    except ImportError:
        from ._pykernel import canonical_key
else:
    from ._pykernel import canonical_key

__all__ = ["canonical_key", "BACKEND"]
