"""wmswatch: discovery, distributed monitoring and survey analytics for
public OGC Web Map Services."""

__version__ = "0.1.0"
