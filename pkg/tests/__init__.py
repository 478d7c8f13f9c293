"""
Tests for WristAuth
"""
