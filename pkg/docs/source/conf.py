"""Sphinx configuration file for the goldvortex documentation.

The introduction is generated from the README.md file in the root of the repository.
The README.md file is copied to the Sphinx source directory with these changes:

1. Replace markdown alerts with admonitions.
2. Replace relative links to `example/` files with absolute links to GitHub.

The API reference lives in `reference/`.
"""

from __future__ import annotations

import os
import sys
import textwrap
from pathlib import Path

package_path = Path("../..").resolve()
sys.path.insert(0, str(package_path))
PYTHON_PATH = os.environ.get("PYTHONPATH", "")
os.environ["PYTHONPATH"] = f"{package_path}:{PYTHON_PATH}"

docs_path = Path("..").resolve()
sys.path.insert(1, str(docs_path))

import goldvortex  # noqa: E402

project = "goldvortex"
copyright = "2024, Bas Nijholt"  # noqa: A001
author = "Bas Nijholt"

version = goldvortex.__version__
release = goldvortex.__version__

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.autosectionlabel",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
    "myst_parser",
    "sphinx_autodoc_typehints",
]

autosectionlabel_maxdepth = 5
myst_heading_anchors = 0
myst_enable_extensions = ["dollarmath"]
source_suffix = [".rst", ".md"]
master_doc = "index"
language = "en"
pygments_style = "sphinx"
html_theme = "furo"
htmlhelp_basename = "goldvortexdoc"
default_role = "autolink"
intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}


def _change_alerts_to_admonitions(input_text: str) -> str:
    mapping = {
        "IMPORTANT": "important",
        "NOTE": "note",
        "TIP": "tip",
        "WARNING": "caution",
    }
    edited_text = []
    current_block_type = None
    for line in input_text.split("\n"):
        if any(line.strip().startswith(f"> [!{marker}]") for marker in mapping):
            current_block_type = next(
                marker for marker in mapping if f"> [!{marker}]" in line
            )
            edited_text.append("```{" + mapping[current_block_type] + "}")
        elif current_block_type and line.strip() == ">":
            continue
        elif current_block_type and not line.strip().startswith(">"):
            edited_text.append("```")
            edited_text.append(line)
            current_block_type = None
        elif current_block_type:
            edited_text.append(line.lstrip("> ").rstrip())
        else:
            edited_text.append(line)
    return "\n".join(edited_text)


def write_introduction(readme_path: Path, output_path: Path) -> None:
    """Copy the README with admonitions and absolute example links."""
    content = readme_path.read_text(encoding="utf-8")
    content = _change_alerts_to_admonitions(content)
    content = content.replace(
        "(example/",
        "(https://github.com/basnijholt/goldvortex/tree/main/example/",
    )
    output_path.write_text(content, encoding="utf-8")


def write_index_file(source_path: Path) -> None:
    """Write an index file for the documentation."""
    content = textwrap.dedent(
        """\
        ```{include} introduction.md
        ```

        ```{toctree}
        :hidden: true
        :maxdepth: 2
        :glob:

        introduction
        reference/index
        ```
        """,
    )
    (source_path / "index.md").write_text(content, encoding="utf-8")


source = docs_path / "source"
write_introduction(package_path / "README.md", source / "introduction.md")
write_index_file(source)
