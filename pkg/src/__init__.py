"""Transformada espectral de dímeros en el toro y su inversa"""
