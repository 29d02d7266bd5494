"""Person-name link analysis over clustered news.

Builds an inverted occurrence index from entity/cluster records, ranks
related and associated persons, lays out relation maps, and evaluates
rankings against an encyclopedia-derived baseline.
"""

__version__ = "0.1.0"
