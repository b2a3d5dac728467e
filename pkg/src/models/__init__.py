"""Modelos de grafos, polinomios de Laurent y datos espectrales"""
