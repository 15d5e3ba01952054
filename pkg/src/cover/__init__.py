"""The cyclic-cover twist construction and its symbolic verification"""
