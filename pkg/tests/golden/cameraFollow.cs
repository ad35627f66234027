using UnityEngine;

public class CameraFollow : MonoBehaviour
{
    public Transform target;
    public float offsetX = 0f;
    public float offsetY = 5f;
    public float offsetZ = -8f;
    public float smoothing = 4f;

    private void LateUpdate()
    {
        FollowTarget();
    }

    public void FollowTarget()
    {
        if (target == null)
        {
            return;
        }
        Vector3 desired = target.position + new Vector3(offsetX, offsetY, offsetZ);
        transform.position = Vector3.Lerp(transform.position, desired, smoothing * Time.deltaTime);
        transform.LookAt(target);
    }
}
