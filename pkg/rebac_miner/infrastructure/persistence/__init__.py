from .bundle_repository import FileBundleRepository

__all__ = ["FileBundleRepository"]
