"""Pruebas de la transformada espectral de dímeros"""
