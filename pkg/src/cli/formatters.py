"""
formatters.py

Output formatters for command results and the `FormatterManager` that hands them out by name.
"""

from abc import ABC, abstractmethod

from cli.schemas import CommandOutput
from reasoning.errors import UsageError


class BaseFormatter(ABC):
    """Renders a command output as the text written to stdout."""

    @abstractmethod
    def format(self, output: CommandOutput) -> str:
        """
        Args:
            output (CommandOutput): The command's output model.

        Returns:
            str: Text ending with a newline.
        """
        pass


class TextFormatter(BaseFormatter):
    def format(self, output: CommandOutput) -> str:
        return "".join(line + "\n" for line in output.text_lines())


class JsonFormatter(BaseFormatter):
    def format(self, output: CommandOutput) -> str:
        return output.model_dump_json(indent=2) + "\n"


class FormatterManager:
    """
    Maps format names (as given to `--format`) to formatter instances.
    """

    def __init__(self):
        self.format_map: dict[str, BaseFormatter] = {
            "text": TextFormatter(),
            "json": JsonFormatter(),
        }

    @property
    def names(self) -> list[str]:
        return list(self.format_map)

    def get_formatter(self, name: str) -> BaseFormatter:
        """
        Raises:
            UsageError: For unknown format names.
        """
        try:
            return self.format_map[name.lower()]
        except KeyError:
            raise UsageError(f"unknown output format {name!r}") from None


formatter_manager = FormatterManager()
