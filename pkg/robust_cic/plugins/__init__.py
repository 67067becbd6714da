"""
Namespace package for built-in subcommands.
"""
# Plugins can be discovered automatically via pkgutil or entry points
