from pydantic import BaseModel


class ModuleConfig(BaseModel):
    class Config:
        extra = 'forbid'
        validate_assignment = True
