"""lfdr-mix : estimation non paramétrique de la densité alternative et du lFDR."""

__version__ = "0.1.0"
