# This file makes the reports directory a Python package
