"""auvnav: closed-loop language-to-action planning stack for a simulated AUV."""

__version__ = "0.1.0"
