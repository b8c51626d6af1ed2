"""Tests Package - pytest suite for services, CLI and API"""
