"""
Model factory for creating and managing hierarchy models.
"""
from typing import Dict, List, Optional, Tuple, Type

from ..exceptions import HierarchyError, ModelNotFoundError
from ..utils.logger import get_logger
from .base import HierarchyModel, ModelConfig

logger = get_logger(__name__)


class HierarchyFactory:
    """
    Factory class for creating and managing hierarchy models.

    Models are registered by name; instances are cached per name and
    configuration so that repeated lookups share one immutable model.
    """

    # Registry of available models
    _models: Dict[str, Type[HierarchyModel]] = {}
    _configs: Dict[str, Type[ModelConfig]] = {}
    _instances: Dict[Tuple, HierarchyModel] = {}

    @classmethod
    def register_model(
        cls,
        name: str,
        model_class: Type[HierarchyModel],
        config_class: Type[ModelConfig] = ModelConfig
    ) -> None:
        """
        Register a new model.

        Args:
            name: Model name used by config and CLI
            model_class: Model class (must inherit from HierarchyModel)
            config_class: Config class (must inherit from ModelConfig)
        """
        cls._models[name] = model_class
        cls._configs[name] = config_class
        logger.info(f"Registered model: {name}")

    @classmethod
    def create_model(cls, name: str, config: Optional[Dict] = None) -> HierarchyModel:
        """
        Create a model instance.

        Args:
            name: Model name
            config: Configuration dictionary (e.g. {"alpha": 2.0} for Morse)

        Returns:
            Model instance

        Raises:
            ModelNotFoundError: If model is not registered
            HierarchyError: If the configuration is invalid
        """
        if name not in cls._models:
            raise ModelNotFoundError(name, cls.list_models())

        options = dict(config or {})
        options.setdefault("name", name)
        config_class = cls._configs[name]
        try:
            model_config = config_class(**options)
        except TypeError as e:
            raise HierarchyError(f"Invalid configuration for model '{name}': {e}")

        model = cls._models[name](model_config)
        logger.debug(f"Model created: {name} {options}")
        return model

    @classmethod
    def get_or_create_model(cls, name: str, config: Optional[Dict] = None) -> HierarchyModel:
        """
        Get a cached model or create a new one.

        Args:
            name: Model name
            config: Configuration dictionary

        Returns:
            Model instance
        """
        key = (name, tuple(sorted((config or {}).items())))
        if key not in cls._instances:
            cls._instances[key] = cls.create_model(name, config)
        return cls._instances[key]

    @classmethod
    def list_models(cls) -> List[str]:
        """
        List all registered models.

        Returns:
            List of model names
        """
        return list(cls._models.keys())

    @classmethod
    def is_registered(cls, name: str) -> bool:
        return name in cls._models

    @classmethod
    def clear_cache(cls) -> None:
        """Drop cached model instances."""
        cls._instances.clear()
