"""
disruptkit computes disruption indicators on windowed citation graphs.

A focal paper is disruptive when the papers citing it ignore its cited
references, and consolidating when they cite both. Starting from this
tripartite network (citers of the focal paper only, citers of the focal
paper and of its references, citers of the references only), the package
implements DI_1 and its published variants:

  1) citation-based indicators: DI_1, DI^noR, DI*/DI#, DEP, originality
     (base and weighted), the per prior art D and C indicators, and their
     modifiers (link threshold l, exclusion of the x% most cited
     references, field specific reference pool, m_t/n_t weighting);
  2) knowledge-element indicators ED and mED, built on MeSH-like
     descriptors in entity or relation mode.

Graphs are ingested from JSON-lines node files and CSV edge files, cached
in a checksummed binary format and never modified afterwards. Scores are
computed in exact rational arithmetic and written with 12 significant
digits; an indicator with an empty denominator is reported as not
computable instead of 0 or 1.

A brute-force oracle recomputes every indicator from the raw edge list and
backs the test suite; golden vectors from published worked examples are
shipped with the package (`disruptkit validate`).
"""

__version__ = "0.1.0"
__license__ = "BSD 3-Clause License"


from . import cli
