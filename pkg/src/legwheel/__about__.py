__all__ = [
    "__title__",
    "__summary__",
    "__uri__",
    "__version__",
    "__author__",
    "__email__",
    "__license__",
    "__copyright__",
]

__title__ = "legwheel"
__summary__ = (
    "legwheel is a central pattern generator controller and quasi-static simulator "
    "for transformable leg-wheel robots."
)
__uri__ = ""

__version__ = "0.1.0"

__author__ = "The legwheel developers"
__email__ = ""

__license__ = "BSD-3-Clause"
__copyright__ = f"Copyright 2024 {__author__}"
