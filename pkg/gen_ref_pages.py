"""Generate the code-reference pages (Reference > Code API) from the vqtransfer package.

Run by the mkdocs ``gen-files`` plugin at build/serve time: one
``reference/api/<module>.md`` page per module with a ``:::`` mkdocstrings
directive, plus a literate-nav ``SUMMARY.md``.
"""

from pathlib import Path

import mkdocs_gen_files

SRC = Path("vqtransfer/src")
PKG = SRC / "vqtransfer"

SKIP = {"_version", "__main__"}

nav = mkdocs_gen_files.Nav()

for path in sorted(PKG.glob("*.py")):
    name = path.stem
    if name in SKIP:
        continue
    if name == "__init__":
        parts: tuple[str, ...] = ("vqtransfer",)
        doc_path = Path("index.md")
    else:
        parts = ("vqtransfer", name)
        doc_path = Path(f"{name}.md")

    full_doc_path = Path("reference/api", doc_path)
    nav[parts] = doc_path.as_posix()

    with mkdocs_gen_files.open(full_doc_path, "w") as fd:
        ident = ".".join(parts)
        fd.write(f"# `{ident}`\n\n::: {ident}\n")

    mkdocs_gen_files.set_edit_path(full_doc_path, path)

with mkdocs_gen_files.open("reference/api/SUMMARY.md", "w") as nav_file:
    nav_file.writelines(nav.build_literate_nav())
