"""Models Package - Pydantic models for physics inputs, tables, densities and runs"""
