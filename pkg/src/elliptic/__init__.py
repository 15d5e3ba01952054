"""Desk-scale rank certification for the elliptic case s = 2, deg f = 3"""
