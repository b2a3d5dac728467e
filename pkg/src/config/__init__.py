"""Tolerancias, esquema JSON y ejemplos incluidos"""
