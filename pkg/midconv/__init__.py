__version__ = "0.3.0"

__all__ = [ 'fields', 'poly', 'linalg', 'mult_conv', 'fuchsian', 'katz', 'pcurv', 'monodromy', 'document' ]
