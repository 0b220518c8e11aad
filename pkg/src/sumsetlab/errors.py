class InvalidParameterError(ValueError):
    """Raised when an operation is called outside its domain."""
