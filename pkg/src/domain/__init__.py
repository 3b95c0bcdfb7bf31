"""Domain contracts for the query simulator."""
