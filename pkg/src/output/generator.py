"""
Output Generator Module.
Writes run artifacts to disk: sweep tables, reports and configuration dumps.
"""
import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import yaml


class OutputGenerator:
    """
    Output Generator for writing artifacts to disk.

    Supports CSV, JSON, YAML and plain text. Output is deterministic: JSON
    keys are sorted and CSV rows use "\\n" line endings.
    """

    def __init__(self, output_dir: Union[str, Path]):
        """
        Initialize the output generator.

        Args:
            output_dir: Base directory for output
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def write_file(self, path: str, content: str, overwrite: bool = False) -> str:
        """
        Write content to a file.

        Args:
            path: Relative path for the file
            content: Content to write
            overwrite: Whether to overwrite existing files

        Returns:
            Absolute path to the created file
        """
        full_path = self.output_dir / path
        full_path.parent.mkdir(parents=True, exist_ok=True)

        if full_path.exists() and not overwrite:
            raise FileExistsError(f"File already exists: {full_path}")

        with open(full_path, "w", encoding="utf-8", newline="") as f:
            f.write(content)

        return str(full_path)

    def write_json(self, path: str, data: Union[Dict, List],
                   pretty: bool = True, overwrite: bool = False) -> str:
        """
        Write data as JSON to a file.

        Args:
            path: Relative path for the file
            data: Data to write as JSON
            pretty: Whether to format the JSON with indentation
            overwrite: Whether to overwrite existing files

        Returns:
            Absolute path to the created file
        """
        if not path.lower().endswith(".json"):
            path = f"{path}.json"

        content = to_json(data, pretty)
        return self.write_file(path, content + "\n", overwrite)

    def write_yaml(self, path: str, data: Union[Dict, List],
                   overwrite: bool = False) -> str:
        """
        Write data as YAML to a file.

        Args:
            path: Relative path for the file
            data: Data to write as YAML
            overwrite: Whether to overwrite existing files

        Returns:
            Absolute path to the created file
        """
        if not (path.lower().endswith(".yaml") or path.lower().endswith(".yml")):
            path = f"{path}.yaml"

        content = yaml.safe_dump(data, default_flow_style=False, sort_keys=True)
        return self.write_file(path, content, overwrite)

    def write_csv(self, path: str, header: Sequence[str], rows: Iterable[Sequence[Any]],
                  overwrite: bool = False) -> str:
        """
        Write rows as CSV with a header line.

        Args:
            path: Relative path for the file
            header: Column names
            rows: Already formatted cells, one sequence per row
            overwrite: Whether to overwrite existing files

        Returns:
            Absolute path to the created file
        """
        if not path.lower().endswith(".csv"):
            path = f"{path}.csv"

        return self.write_file(path, to_csv(header, rows), overwrite)

    def get_output_path(self, relative_path: Optional[str] = None) -> str:
        """
        Get the absolute path to the output directory or a file inside it.

        Args:
            relative_path: Optional relative path within the output directory

        Returns:
            Absolute path
        """
        if relative_path:
            return str((self.output_dir / relative_path).resolve())
        return str(self.output_dir.resolve())


def to_json(data: Any, pretty: bool = True) -> str:
    """Serialise with sorted keys so repeated runs produce identical text."""
    return json.dumps(data, indent=2 if pretty else None, sort_keys=True)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()
