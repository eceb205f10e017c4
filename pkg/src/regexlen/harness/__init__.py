"""Instance generation, brute-force oracle and differential reports."""
