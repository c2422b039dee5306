"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A physical or numerical parameter is out of its allowed range."""


class ConfigurationError(RuntimeError):
    """A run is configured inconsistently (e.g. missing background reference)."""


class ConfigParseError(ValueError):
    """A config file could not be parsed.

    Carries the line number and offending key so the CLI can print a
    useful diagnostic.
    """

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        loc = ""
        if line is not None:
            loc = f"line {line}: "
        if key is not None:
            loc += f"key '{key}': "
        super().__init__(loc + message)


class PresetLookupError(KeyError):
    """Unknown preset name; the message lists the valid names."""

    def __init__(self, name: str, valid: list[str]):
        self.name = name
        self.valid = list(valid)
        super().__init__(f"unknown preset '{name}'; valid presets: {', '.join(valid)}")

    def __str__(self) -> str:
        return self.args[0]


class NumericBlowupError(RuntimeError):
    """Field amplitude exceeded the blowup threshold during propagation."""

    def __init__(self, step: int, max_abs: float):
        self.step = step
        self.max_abs = max_abs
        super().__init__(
            f"field blew up at step {step} (max |psi| = {max_abs:.3e}); "
            "attractive nonlinearity or an unstable configuration can do this"
        )
