"""
oblivroute - oblivious routing from convex combinations of electrical flows.

This package builds competitive oblivious routing schemes with a
multiplicative-weights construction over sketched electrical loads, and
evaluates, stores and queries them.
"""
