"""sstt: a batch type checker for a simplicial type theory.

Layers: tope logic (decidable entailment over the directed interval), shape
calculus (cube contexts restricted by topes, inclusions, Leibniz tensor), and
a dependent type kernel with extension types checked against judgmental
boundaries.  A small surface language (.sst files), a CLI, and a bundled
corpus of machine-checked definitions sit on top.
"""

__version__ = "0.1.0"
