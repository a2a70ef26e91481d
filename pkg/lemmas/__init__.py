# This file makes the lemmas directory a Python package
