"""biext - verification workbench for biextension asymptotics."""

__version__ = "0.1.0"
