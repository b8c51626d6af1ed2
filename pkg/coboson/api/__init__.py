"""API Router Package - Spectrum, coboson and density endpoints"""
