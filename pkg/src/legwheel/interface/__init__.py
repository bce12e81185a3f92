"""
=========
Interface
=========

The ``legwheel`` command line tool and its logging and error handling.

"""
