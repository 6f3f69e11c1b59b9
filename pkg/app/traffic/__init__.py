from .cbr import CbrSource, select_flows

__all__ = ["CbrSource", "select_flows"]
