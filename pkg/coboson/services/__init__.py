"""Services Package - Spectra, normalization factors, observables, densities and oracles"""
