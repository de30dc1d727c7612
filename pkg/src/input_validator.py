# /usr/bin/env python3
# Input Validation Utilities for the Connectivity CLI
# Validates command-line arguments and environment settings with detailed error messages

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Tuple

from dotenv import load_dotenv

from src.constants import (
    BOOLEAN_WORDS,
    DEFAULT_CACHE_DIR,
    ENV_CACHE_DIR,
    ENV_USE_CACHE,
    GAMMA_CHOICES,
    STRUCTURE_ENUMERATION_LIMIT,
)
from src.core import GroundSet, Subset
from src.foliation import FunctorialStructure


class ValidationError(Exception):
    """Custom exception for validation errors with user-friendly messages."""


@dataclass(frozen=True)
class Settings:
    """Runtime configuration read from the environment."""

    cache_dir: str = DEFAULT_CACHE_DIR
    use_cache: bool = False


class EnvironmentValidator:
    """Validates environment configuration loaded from .env."""

    @staticmethod
    def _flag(name: str, default: bool) -> bool:
        raw = os.getenv(name, "").strip().lower()
        if not raw:
            return default
        if raw not in BOOLEAN_WORDS:
            raise ValidationError(
                f"Configuration Error: {name} must be 'true' or 'false'\n"
                f"Received: {raw}\n"
                f"Edit .env (see .env.example) and set {name}=true or {name}=false"
            )
        return BOOLEAN_WORDS[raw]

    @staticmethod
    def load_settings(env_file: Optional[str] = None) -> Settings:
        """
        Load settings from the environment and an optional .env file.

        A missing .env file is not an error: every setting has a default.

        Args:
            env_file: Explicit .env path (defaults to the nearest .env)

        Returns:
            Settings: Validated configuration

        Raises:
            ValidationError: If a setting has an invalid value
        """
        load_dotenv(env_file)

        cache_dir = os.getenv(ENV_CACHE_DIR, "").strip() or DEFAULT_CACHE_DIR
        if Path(cache_dir).exists() and not Path(cache_dir).is_dir():
            raise ValidationError(
                f"Configuration Error: {ENV_CACHE_DIR} points to a file\n"
                f"Received: {cache_dir}\n"
                "Choose a directory path for the cache"
            )

        return Settings(
            cache_dir=cache_dir,
            use_cache=EnvironmentValidator._flag(ENV_USE_CACHE, False),
        )


class SubsetValidator:
    """Validates subsets given as point labels on the command line."""

    @staticmethod
    def parse(ground: GroundSet, labels: Iterable[str]) -> Subset:
        """
        Turn point labels into a subset of ``ground``.

        Args:
            ground: Carrier the labels must belong to
            labels: Raw labels from --set

        Returns:
            Subset: Bitmask of the named points (empty for no labels)

        Raises:
            ValidationError: If a label is unknown or repeated
        """
        mask = 0
        for label in labels:
            label = label.strip()
            if label not in ground.labels:
                raise ValidationError(
                    f"Unknown point: {label}\n"
                    f"Valid points: {' '.join(ground.labels)}"
                )
            bit = 1 << ground.index(label)
            if mask & bit:
                raise ValidationError(f"Point {label} is listed twice")
            mask |= bit
        return mask


class GammaValidator:
    """Validates the functorial structure pair given to phi."""

    @staticmethod
    def validate_pair(gamma0: str, gamma1: str) -> Tuple[FunctorialStructure, FunctorialStructure]:
        """
        Resolve the --gamma0/--gamma1 letters and check their order.

        Args:
            gamma0: Letter for the non-connected points
            gamma1: Letter for the connected points

        Returns:
            Tuple of the two functorial structures, gamma0 first

        Raises:
            ValidationError: If gamma0 lies above gamma1
        """
        low = FunctorialStructure[GAMMA_CHOICES[gamma0]["key"]]
        high = FunctorialStructure[GAMMA_CHOICES[gamma1]["key"]]
        if not low <= high:
            allowed = [
                letter
                for letter, choice in GAMMA_CHOICES.items()
                if low <= FunctorialStructure[choice["key"]]
            ]
            raise ValidationError(
                f"--gamma0 {gamma0} must be below --gamma1 {gamma1}\n"
                f"{gamma0}: {GAMMA_CHOICES[gamma0]['display']}\n"
                f"{gamma1}: {GAMMA_CHOICES[gamma1]['display']}\n"
                f"With --gamma0 {gamma0} use --gamma1 {' or '.join(allowed)}"
            )
        return low, high


class SizeValidator:
    """Validates explicit carrier sizes requested on the command line."""

    @staticmethod
    def validate_survey_size(n: int) -> int:
        if not 0 <= n <= STRUCTURE_ENUMERATION_LIMIT:
            raise ValidationError(
                f"Survey size must be between 0 and {STRUCTURE_ENUMERATION_LIMIT}\n"
                f"Received: {n}"
            )
        return n


class FileValidator:
    """Validates input document paths."""

    @staticmethod
    def read_text(path: str) -> str:
        """
        Read a UTF-8 document.

        Raises:
            ValidationError: If the file is missing or not UTF-8
        """
        file_path = Path(path)
        if not file_path.is_file():
            raise ValidationError(f"File not found: {path}")
        try:
            return file_path.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            raise ValidationError(f"File is not valid UTF-8: {path}") from None


def format_error_message(error: Exception) -> str:
    """
    Format an error for stderr.

    Args:
        error: The exception that occurred

    Returns:
        Single "Error: ..." message, continuation lines indented
    """
    lines = str(error).splitlines() or [type(error).__name__]
    return "Error: " + "\n  ".join(lines)
