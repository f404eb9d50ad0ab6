from pydantic import BaseModel, create_model
from typing import Generic, List, Type, TypeVar, get_args

import pandas as pd

# Generic type variable
T = TypeVar("T")


def schema(fields: dict, name: str = "Row"):
    """
    Create a table row model with customized fields.

    Args:
        fields (dict): customized fields to add dynamically.
            example:
                fields = {
                    "gamma": (float, ...),
                    "centroid_mse": (float, ...),
                    "certificate": (float | None, None),
                }
                schema(fields)
        name (str): Name of the generated model.

    Returns:
        Pydantic model: Customized row class.
    """

    return create_model(name, **fields)


class Table(BaseModel, Generic[T]):
    rows: List[T]

    def to_df(self) -> pd.DataFrame:
        """Rows as a DataFrame, columns in field order."""
        row_model = get_args(type(self).model_fields["rows"].annotation)[0]
        columns = list(row_model.model_fields)
        return pd.DataFrame([row.model_dump() for row in self.rows], columns=columns)


def create_format(fields: dict, name: str = "Row") -> Type[Table]:
    """
    Create a generic `Table` model using a dynamically defined row schema.

    Every result table written by the experiment commands is validated through one of
    these models before it reaches disk.

    Args:
        fields (dict): A dictionary of field definitions for the row model.
            Example:
                fields = {
                    "omega": (float, ...),
                    "gap": (float, ...),
                    "bound": (float, ...),
                }
        name (str): Name of the row model.

    Returns:
        Type[Table]: A `Table` model class parameterized with the row schema.
    """

    Row = schema(fields, name)
    return Table[Row]
