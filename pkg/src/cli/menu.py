"""
menu.py

Names and one-line descriptions of the CLI subcommands, shown by `chasekit --help`.
"""

COMMANDS: dict[str, str] = {
    "classify": "Classify the TGDs and list affected positions",
    "chase": "Run the chase and print the step log",
    "answer": "Compute the certain answers of a named query",
    "contain": "Check containment (or equivalence) of two named queries",
    "egd-check": "Check whether the EGDs make the chase fail",
    "forest": "Print the guarded chase forest",
    "store-stats": "Run blocked saturation and report cloud-store statistics",
    "history": "List recently journaled runs",
}
