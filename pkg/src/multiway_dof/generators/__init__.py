"""Signal space alignment and scheme construction."""

from .alignment import receiver_filters, shared_dim, shared_subspace

__all__ = ["receiver_filters", "shared_dim", "shared_subspace"]
