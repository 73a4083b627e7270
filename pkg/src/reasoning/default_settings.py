"""
default_settings.py

This module defines default configuration constants used across the reasoning engine.
"""

DEFAULT_MAX_STEPS = 10_000
"""
int: Maximum number of chase steps (TGD and EGD applications) before a run is reported as
BudgetExhausted.
"""
DEFAULT_MAX_DEPTH = 64
"""
int: Maximum guarded-chase-forest depth. Triggers whose new node would sit deeper are dropped and
the run is reported as BudgetExhausted.
"""
DEFAULT_BOUNDED_DEPTH = 16
"""
int: Depth of the oblivious chase used by the `bounded` answering strategy when none is given.
"""
DEFAULT_CHASE_MODE = "restricted"
"""
str: Applicability mode used by the CLI when `--mode` is absent.
"""
DEFAULT_EGD_MODE = "interleave"
"""
str: How the CLI treats EGDs when `--egd` is absent. `interleave` drains EGDs after every TGD step,
`separate` runs the failure check and then ignores EGDs.
"""


DEFAULT_MAX_ROUNDS = 16
"""
int: Outer rounds of blocked saturation before the store is reported as not stabilized.
"""
DEFAULT_MAX_STORE_SIZE = 100_000
"""
int: Maximum number of cloud-store entries in one round of blocked saturation.
"""


DEFAULT_MAX_SQUID_CANDIDATES = 1_000_000
"""
int: Number of (cover, folding, Vδ) candidates the squid enumerator inspects before it stops and
flags the stream as truncated.
"""


MEMORY_CHECK_INTERVAL = 256
"""
int: The chase samples peak memory every this many steps when `CHASEKIT_MAX_MEMORY_MB` is set.
"""

CANONICAL_NULL_BASE = 1 << 40
"""
int: Canonical nulls ξ1, ξ2, … use indexes CANONICAL_NULL_BASE + 1, + 2, …

Chase runs allocate from 1 upwards and never reach this range, so canonical keys cannot collide
with real nulls.
"""

NEQ_PREDICATE_NAME = "neq"
"""
str: Preferred name of the inequality predicate materialized by the EGD failure check.
A suffix is appended when the program already uses the name.
"""
