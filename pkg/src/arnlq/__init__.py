"""arnlq: compile Arabic natural-language questions into SPARQL queries.

The pipeline reads a question together with its constituency parse tree,
extracts noun phrases and the words relating them, matches both against an
ontology carrying Arabic labels, and assembles an executable SPARQL query.
"""

__version__ = "0.1.0"
