# This file makes the graphs directory a Python package
