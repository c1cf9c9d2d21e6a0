# -*- coding: utf-8 -*-

"""Unit test package for sweep_utils."""
