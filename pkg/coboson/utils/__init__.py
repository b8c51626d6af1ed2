"""Utils Package - Errors, logging, sweeps and table output"""
