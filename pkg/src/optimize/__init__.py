"""
Optimización de los datos de scrambling: descenso greedy y escaneo exhaustivo.
"""
