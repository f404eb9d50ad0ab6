"""Unit test package for sonclust."""
