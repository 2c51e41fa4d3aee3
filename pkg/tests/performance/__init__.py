"""Statistical acceptance tests for the optimizers and the harness.

These run hundreds of random instances and are skipped unless
``RUN_PERFORMANCE=1`` is set.
"""
