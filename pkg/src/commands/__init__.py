"""Comandos click de la interfaz de línea de comandos"""
