"""Servicios del dominio: grafo, geometría tórica, Kasteleyn, transformadas directa e inversa"""
