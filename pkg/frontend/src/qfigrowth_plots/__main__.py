from .render import entry

entry()
