"""
===============
The Config Tree
===============

A layered configuration structure.

Scenario configuration in ``legwheel`` is assembled from several sources:
package defaults declared by the components themselves, an optional user file
at ``~/legwheel.yaml``, the scenario file, and finally command line overrides.
Each source writes into its own layer of a :class:`ConfigTree` and a lookup
returns the value from the highest priority layer that set it.

.. code-block:: python

    >>> tree = ConfigTree(layers=["base", "scenario", "override"])
    >>> tree.update({"controller": {"k_omega": 5.0, "dt": 0.02}}, layer="base")
    >>> tree.update({"controller": {"k_omega": 8.0}}, layer="scenario")
    >>> tree.controller.k_omega
    8.0
    >>> tree.controller.dt
    0.02

"""
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

import yaml

from legwheel.exceptions import LegWheelError

ConfigData = Union[Dict, str, Path, "ConfigTree", None]


class ConfigurationError(LegWheelError):
    """Base class for configuration errors."""

    def __init__(self, message: str, value_name: Optional[str]):
        self.value_name = value_name
        super().__init__(message)


class ConfigurationKeyError(ConfigurationError, KeyError):
    """Error raised when a configuration lookup fails."""

    pass


class DuplicatedConfigurationError(ConfigurationError):
    """Error raised when a value is set twice in the same layer.

    Attributes
    ----------
    layer
        The layer at which the value was being set.
    source
        Where the value already stored at that layer came from.
    value
        The value already stored at that layer.

    """

    def __init__(
        self, message: str, name: str, layer: str, source: Optional[str], value: Any
    ):
        self.layer = layer
        self.source = source
        self.value = value
        super().__init__(message, name)


class ConfigNode:
    """A single configuration value with one slot per layer.

    Nodes record the source of every value they hold so that the final
    configuration of a trial can be traced back to the file or flag that
    produced it. Nodes are created and filled by :class:`ConfigTree`.

    """

    def __init__(self, layers: List[str], name: str):
        self._name = name
        self._layers = layers
        self._values: Dict[str, Tuple[Optional[str], Any]] = {}
        self._frozen = False
        self._accessed = False

    @property
    def name(self) -> str:
        return self._name

    @property
    def accessed(self) -> bool:
        """Whether the value has been read since the node was created."""
        return self._accessed

    @property
    def metadata(self) -> List[Dict[str, Any]]:
        """All stored values with their layer and source, lowest priority first."""
        return [
            {
                "layer": layer,
                "source": self._values[layer][0],
                "value": self._values[layer][1],
            }
            for layer in self._layers
            if layer in self._values
        ]

    def freeze(self):
        self._frozen = True

    def get_value(self, layer: Optional[str] = None) -> Any:
        """Returns the value at ``layer``, or at the highest layer holding one.

        Raises
        ------
        ConfigurationKeyError
            If no layer holds a value.

        """
        if layer in self._values:
            value = self._values[layer][1]
        else:
            populated = [name for name in self._layers if name in self._values]
            if not populated:
                raise ConfigurationKeyError(f"No value stored for {self.name}.", self.name)
            value = self._values[populated[-1]][1]
        self._accessed = True
        return value

    def update(self, value: Any, layer: Optional[str], source: Optional[str]):
        """Stores ``value`` at ``layer`` (the outermost layer if none is given).

        Raises
        ------
        ConfigurationError
            If the node is frozen.
        ConfigurationKeyError
            If the layer does not exist.
        DuplicatedConfigurationError
            If the layer already holds a value.

        """
        if self._frozen:
            raise ConfigurationError(
                f"Frozen value {self.name} cannot be assigned.", self.name
            )
        layer = layer if layer else self._layers[-1]
        if layer not in self._layers:
            raise ConfigurationKeyError(f"No layer {layer} for value {self.name}.", self.name)
        if layer in self._values:
            old_source, old_value = self._values[layer]
            raise DuplicatedConfigurationError(
                f"Value {self.name} has already been set at layer {layer}.",
                name=self.name,
                layer=layer,
                source=old_source,
                value=old_value,
            )
        self._values[layer] = (source, value)

    def __bool__(self):
        return bool(self._values)

    def __repr__(self):
        return "\n".join(
            f"{m['layer']}: {m['value']}\n    source: {m['source']}"
            for m in reversed(self.metadata)
        )


class ConfigTree:
    """A nested mapping of :class:`ConfigNode` values with attribute access.

    Parameters
    ----------
    data
        Initial data stored at the lowest layer. A nested dictionary, a yaml
        string, a path to a yaml file or another :class:`ConfigTree`.
    layers
        Layer names from lowest to highest priority.
    name
        Dotted name of this subtree, used in error messages.

    """

    def __init__(self, data: ConfigData = None, layers: List[str] = None, name: str = ""):
        self.__dict__["_layers"] = list(layers) if layers else ["base"]
        self.__dict__["_children"] = {}
        self.__dict__["_frozen"] = False
        self.__dict__["_name"] = name
        self.update(data, layer=self._layers[0], source="initial data")

    @property
    def layers(self) -> List[str]:
        return list(self._layers)

    def freeze(self):
        """Makes the tree and all of its children read only."""
        self.__dict__["_frozen"] = True
        for child in self._children.values():
            child.freeze()

    def items(self):
        return self._children.items()

    def keys(self):
        return self._children.keys()

    def values(self):
        return self._children.values()

    def get(self, name: str, default: Any = None) -> Any:
        return self.get_from_layer(name) if name in self else default

    def get_from_layer(self, name: str, layer: Optional[str] = None) -> Any:
        """Returns a value or subtree. Values come from ``layer`` if given."""
        if name not in self:
            full_name = self._qualify(name)
            raise ConfigurationKeyError(f"No value at name {full_name}.", full_name)
        child = self._children[name]
        return child.get_value(layer) if isinstance(child, ConfigNode) else child

    def unused_keys(self) -> List[str]:
        """Dotted names of every value that has never been read."""
        unused = []
        for name, child in self.items():
            if isinstance(child, ConfigNode):
                if not child.accessed:
                    unused.append(name)
            else:
                unused.extend(f"{name}.{key}" for key in child.unused_keys())
        return unused

    def to_dict(self) -> Dict:
        """Collapses the tree to a plain nested dictionary of winning values."""
        return {
            name: child.get_value() if isinstance(child, ConfigNode) else child.to_dict()
            for name, child in self.items()
        }

    def metadata(self, name: str) -> List[Dict[str, Any]]:
        if name not in self:
            full_name = self._qualify(name)
            raise ConfigurationKeyError(f"No configuration value {full_name}.", full_name)
        return self._children[name].metadata

    def update(
        self, data: ConfigData, layer: Optional[str] = None, source: Optional[str] = None
    ):
        """Merges ``data`` into the tree at ``layer``.

        Raises
        ------
        ConfigurationError
            If the tree is frozen, the data cannot be read, or a value would
            replace a subtree (or the reverse).
        DuplicatedConfigurationError
            If a value is set twice in the same layer.

        """
        if data is None:
            return
        data, source = _coerce(data, source)
        for key, value in data.items():
            self._set(key, value, layer, source)

    def _set(self, name: str, value: Any, layer: Optional[str], source: Optional[str]):
        if self._frozen:
            raise ConfigurationError(
                f"Frozen configuration {self._name} cannot be assigned.", self._name
            )
        existing = self._children.get(name)
        if isinstance(value, dict):
            if existing is None:
                existing = ConfigTree(layers=self._layers, name=self._qualify(name))
                self._children[name] = existing
            elif isinstance(existing, ConfigNode):
                raise ConfigurationError(
                    "Cannot assign a mapping to a configuration value.", self._qualify(name)
                )
        else:
            if existing is None:
                existing = ConfigNode(self._layers, name=self._qualify(name))
                self._children[name] = existing
            elif isinstance(existing, ConfigTree):
                raise ConfigurationError(
                    "Cannot assign a value to a configuration section.", self._qualify(name)
                )
        existing.update(value, layer, source)

    def _qualify(self, name: str) -> str:
        return f"{self._name}.{name}" if self._name else name

    def __setattr__(self, name, value):
        if name not in self:
            raise ConfigurationKeyError(
                "New configuration keys can only be created with update.", self._qualify(name)
            )
        self._set(name, value, layer=None, source=None)

    __setitem__ = __setattr__

    def __getattr__(self, name):
        return self.get_from_layer(name)

    def __getitem__(self, name):
        return self.get_from_layer(name)

    def __contains__(self, name) -> bool:
        return name in self._children

    def __iter__(self) -> Iterator[str]:
        return iter(self._children)

    def __len__(self) -> int:
        return len(self._children)

    def __dir__(self):
        return list(self._children) + dir(super())

    def __repr__(self):
        return "\n".join(
            "{}:\n    {}".format(name, repr(child).replace("\n", "\n    "))
            for name, child in self.items()
        )


def _coerce(data: ConfigData, source: Optional[str]) -> Tuple[Dict, Optional[str]]:
    if isinstance(data, dict):
        return data, source
    if isinstance(data, ConfigTree):
        return data.to_dict(), source
    if isinstance(data, Path) or (isinstance(data, str) and data.endswith((".yaml", ".yml"))):
        with open(data) as f:
            loaded = yaml.safe_load(f)
        return (loaded or {}), (source if source else str(data))
    if isinstance(data, str):
        loaded = yaml.safe_load(data)
        if not isinstance(loaded, dict):
            raise ConfigurationError("Yaml configuration text must hold a mapping.", None)
        return loaded, source
    raise ConfigurationError(
        "ConfigTree can only update from dictionaries, yaml strings, paths and ConfigTrees. "
        f"You passed in {type(data)}",
        value_name=None,
    )
