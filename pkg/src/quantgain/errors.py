class EstimationError(ValueError):
    """Raised when an estimator cannot produce a result from the given data.

    This covers violated preconditions (too few distinct observations,
    degenerate samples) as well as honest failures such as a scan that
    exhausts its search range without finding a compatible gain.
    """
