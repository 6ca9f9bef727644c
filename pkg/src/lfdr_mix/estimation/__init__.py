"""Estimateurs de θ, de f et du lFDR."""
