"""Logging, validación de documentos y errores de dominio"""
